n = int(input())
m = 1
tmp = n
while n > 1:
    m = m * n
    tmp = n - 1
    n = tmp
print(m)
