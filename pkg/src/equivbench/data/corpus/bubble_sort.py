def bubble_sort(items):
    n = len(items)
    i = 0
    while i < n:
        j = 0
        while j < n - i - 1:
            if items[j] > items[j + 1]:
                tmp = items[j]
                items[j] = items[j + 1]
                items[j + 1] = tmp
            j = j + 1
        i = i + 1
    return items
